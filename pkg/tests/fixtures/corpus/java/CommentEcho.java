package bench.cases;

import java.io.IOException;
import java.io.PrintWriter;
import javax.servlet.http.*;

public class CommentEcho extends HttpServlet {

    protected void doGet(HttpServletRequest request, HttpServletResponse response) throws IOException {
        String comment = request.getParameter("comment");
        response.setContentType("text/html");
        PrintWriter writer = response.getWriter();
        writer.println("<div>" + comment + "</div>");
    }
}
