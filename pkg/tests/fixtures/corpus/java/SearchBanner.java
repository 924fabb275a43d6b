package bench.cases;

import java.io.IOException;
import java.io.PrintWriter;
import javax.servlet.http.*;

public class SearchBanner extends HttpServlet {

    protected void doGet(HttpServletRequest request, HttpServletResponse response) throws IOException {
        String term = request.getParameter("q");
        response.setContentType("text/html");
        PrintWriter writer = response.getWriter();
        writer.println("<div>" + term + "</div>");
    }
}
