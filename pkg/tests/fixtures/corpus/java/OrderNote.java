package bench.cases;

import java.io.IOException;
import java.io.PrintWriter;
import javax.servlet.http.*;

public class OrderNote extends HttpServlet {

    protected void doGet(HttpServletRequest request, HttpServletResponse response) throws IOException {
        String note = request.getParameter("note");
        response.setContentType("text/html");
        PrintWriter writer = response.getWriter();
        writer.println("<div>" + note + "</div>");
    }
}
